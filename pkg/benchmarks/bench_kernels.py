#!/usr/bin/env python3
"""Timing table for the two Jacobi kernels, jit backend vs pure numpy.

Both backends execute the identical rotation sequence, so besides timing
each size the script checks that their outputs agree to machine precision
(and that the spectra match numpy.linalg).  numpy.linalg timings are shown
as context, not as a target; the interesting column is the crossover where
compiled scalar loops beat slice arithmetic.

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --sizes 4 8 16 24 48 96 --repeats 9

Exit status is 1 if the backends disagree, 0 otherwise.
"""

import argparse
import sys
import time

import numpy as np

from sepmult._kernels import HAVE_NUMBA, MAX_SWEEPS, available_backends

# tolerances used by the production call sites in sepmult.linalg
HERMITIAN_EPS = 1e-14
ONESIDED_EPS = 1e-15

AGREE_TOL = 1e-12


def random_hermitian(rng, n):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return np.ascontiguousarray(0.5 * (a + a.conj().T))


def random_square(rng, n):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return np.ascontiguousarray(a)


def median_seconds(kernel, make_args, repeats):
    times = []
    for _ in range(repeats):
        args = make_args()
        t0 = time.perf_counter()
        sweeps = kernel(*args)
        times.append(time.perf_counter() - t0)
        if sweeps < 0:
            raise RuntimeError("kernel failed to converge while benchmarking")
    return float(np.median(times))


def fmt(seconds):
    if seconds < 1e-3:
        return "%8.1f us" % (seconds * 1e6)
    if seconds < 1.0:
        return "%8.2f ms" % (seconds * 1e3)
    return "%8.2f s " % seconds


def bench_hermitian(backends, sizes, repeats, rng):
    print("hermitian_jacobi: eigenvalues of a complex Hermitian matrix")
    names = list(backends)
    header = "   n " + "".join("%12s" % name for name in names)
    header += "%12s" % "eigh" + ("%14s" % "numpy/numba" if "numba" in names else "")
    print(header)
    worst = 0.0
    for n in sizes:
        h = random_hermitian(rng, n)
        target = HERMITIAN_EPS * float(np.linalg.norm(h))
        row = "%4d " % n
        med = {}
        spectra = {}
        for name in names:
            kernel = backends[name][0]

            def make_args(h=h, n=n):
                return [h.copy(), np.eye(n, dtype=np.complex128),
                        MAX_SWEEPS, target]

            med[name] = median_seconds(kernel, make_args, repeats)
            work = h.copy()
            kernel(work, np.eye(n, dtype=np.complex128), MAX_SWEEPS, target)
            spectra[name] = np.sort(np.real(np.diag(work)))
            row += "%12s" % fmt(med[name])
        t0 = time.perf_counter()
        reference = np.linalg.eigvalsh(h)
        row += "%12s" % fmt(time.perf_counter() - t0)
        if "numba" in names:
            row += "%13.1fx" % (med["numpy"] / med["numba"])
        scale = max(1.0, float(np.max(np.abs(reference))))
        for vals in spectra.values():
            worst = max(worst, float(np.max(np.abs(vals - reference))) / scale)
        print(row)
    print("  worst spectrum deviation from numpy.linalg: %.2e" % worst)
    return worst


def bench_onesided(backends, sizes, repeats, rng):
    print()
    print("onesided_jacobi: column orthogonalization with accumulated rotations")
    names = list(backends)
    header = "   n " + "".join("%12s" % name for name in names)
    header += "%12s" % "svd" + ("%14s" % "numpy/numba" if "numba" in names else "")
    print(header)
    worst = 0.0
    for n in sizes:
        a = random_square(rng, n)
        row = "%4d " % n
        med = {}
        spectra = {}
        for name in names:
            kernel = backends[name][1]

            def make_args(a=a, n=n):
                return [a.copy(), np.eye(n, dtype=np.complex128),
                        MAX_SWEEPS, ONESIDED_EPS]

            med[name] = median_seconds(kernel, make_args, repeats)
            work = a.copy()
            kernel(work, np.eye(n, dtype=np.complex128), MAX_SWEEPS,
                   ONESIDED_EPS)
            spectra[name] = np.sort(np.linalg.norm(work, axis=0))
            row += "%12s" % fmt(med[name])
        t0 = time.perf_counter()
        reference = np.sort(np.linalg.svd(a, compute_uv=False))
        row += "%12s" % fmt(time.perf_counter() - t0)
        if "numba" in names:
            row += "%13.1fx" % (med["numpy"] / med["numba"])
        scale = max(1.0, float(reference[-1]))
        for vals in spectra.values():
            worst = max(worst, float(np.max(np.abs(vals - reference))) / scale)
        print(row)
    print("  worst singular value deviation from numpy.linalg: %.2e" % worst)
    return worst


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+",
                        default=[4, 8, 16, 32, 64])
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    backends = available_backends()
    if not HAVE_NUMBA:
        print("numba is not importable; timing the numpy backend only")
    else:
        # compile outside the timed region
        small = np.eye(2, dtype=np.complex128)
        backends["numba"][0](small.copy(), small.copy(), MAX_SWEEPS, 1e-14)
        backends["numba"][1](small.copy(), small.copy(), MAX_SWEEPS, 1e-15)
    print("backends: %s, repeats per cell: %d (median shown)"
          % (", ".join(backends), args.repeats))
    print()

    rng = np.random.default_rng(args.seed)
    worst = bench_hermitian(backends, args.sizes, args.repeats, rng)
    worst = max(worst, bench_onesided(backends, args.sizes, args.repeats, rng))
    if worst > AGREE_TOL:
        print("BACKEND DISAGREEMENT beyond %g" % AGREE_TOL, file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
