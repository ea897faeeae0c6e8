"""PSL(2,Z) elements, group-ball enumeration, and the classical count.

The enumeration contract: conjugating by sigma_z = (sqrt(y), x/sqrt(y); 0,
1/sqrt(y)) turns the displacement condition 2 cosh rho(z, gamma w) <= X
into a Frobenius-norm bound on sigma_z^{-1} gamma sigma_w, which yields
finite scan ranges for the integer entries.  The scan itself lives in the
compiled kernel (:mod:`hypcount._ballscan`) with a pure-Python fallback
selected here at import time.

Counting functions are step functions, so threshold comparisons use a
guard band: float norms within ``GUARD_BAND * max(1, X)`` of the threshold
are re-tested in exact rational arithmetic (the input coordinates are
binary floats, hence exact dyadic rationals).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import (
    BoundTooLargeError,
    CacheFormatError,
    CacheInvariantError,
    CacheVersionError,
)
from .hypgeom import UpperHalfPoint

try:
    from . import _ballscan as _kernel
except ImportError:  # pragma: no cover - build-dependent
    from . import _ballscan_py as _kernel

from . import _ballscan_py as _kernel_py

KERNEL_NAME = _kernel.KERNEL_NAME
GUARD_BAND = 1e-9
MAX_ENTRY = 2**31
MAX_SCAN_PAIRS = 3e8
CACHE_VERSION = 1

__all__ = [
    "GammaMatrix",
    "BallCache",
    "BallSurvey",
    "ball_enumerate",
    "enumerate_survey",
    "classical_count",
    "classical_error_series",
    "ClassicalSeries",
    "cache_store",
    "cache_load",
    "KERNEL_NAME",
]


@dataclass(frozen=True, order=True)
class GammaMatrix:
    """An element of PSL(2,Z): integer matrix with ad - bc = 1.

    The representative is canonical: c > 0, or c = 0 and a > 0.  Exactly
    one of +-M satisfies this, so equality of instances is equality in
    PSL(2,Z).
    """

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if det != 1:
            raise ValueError(f"determinant must be 1, got {det}")
        if self.c < 0 or (self.c == 0 and self.a < 0):
            object.__setattr__(self, "a", -self.a)
            object.__setattr__(self, "b", -self.b)
            object.__setattr__(self, "c", -self.c)
            object.__setattr__(self, "d", -self.d)

    @classmethod
    def identity(cls) -> "GammaMatrix":
        return cls(1, 0, 0, 1)

    def as_tuple(self):
        return (self.a, self.b, self.c, self.d)

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    @property
    def trace(self) -> int:
        """Trace of the canonical representative (sign is convention-bound)."""
        return self.a + self.d

    def is_hyperbolic(self) -> bool:
        return abs(self.trace) > 2

    def __mul__(self, other: "GammaMatrix") -> "GammaMatrix":
        return GammaMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "GammaMatrix":
        return GammaMatrix(self.d, -self.b, -self.c, self.a)

    def __pow__(self, n: int) -> "GammaMatrix":
        if n < 0:
            return self.inverse() ** (-n)
        result = GammaMatrix.identity()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def apply(self, z: UpperHalfPoint) -> UpperHalfPoint:
        from .hypgeom import mobius_apply

        return mobius_apply(self, z)


# ---------------------------------------------------------------------------
# exact rational norm


def _exact_point(z: UpperHalfPoint):
    return Fraction(z.x), Fraction(z.y)


def frobnorm_exact(quad, zx: Fraction, zy: Fraction, wx: Fraction, wy: Fraction) -> Fraction:
    """2 cosh rho(z, gamma w) as an exact rational (dyadic inputs)."""
    a, b, c, d = (int(v) for v in quad)
    den_re = c * wx + d
    den_im = c * wy
    den = den_re * den_re + den_im * den_im
    num_re = a * wx + b
    num_im = a * wy
    gx = (num_re * den_re + num_im * den_im) / den
    gy = wy / den  # det = 1
    dx = zx - gx
    dy = zy - gy
    return 2 + (dx * dx + dy * dy) / (zy * gy)


# ---------------------------------------------------------------------------
# scan driver


def _check_scan_size(z: UpperHalfPoint, w: UpperHalfPoint, bound: float):
    c_max = math.sqrt(bound / (z.y * w.y)) + 1
    d_half = math.sqrt(bound * w.y / z.y) + abs(w.x) * c_max + 1
    a_half = math.sqrt(bound * z.y / w.y) + abs(z.x) * c_max + 1
    b_half = math.sqrt(bound * z.y * w.y) + abs(z.x) * d_half + abs(w.x) * a_half + 1
    max_entry = max(c_max, d_half, a_half, b_half)
    if max_entry > MAX_ENTRY:
        raise BoundTooLargeError(
            f"bound too large: entry range up to {max_entry:.3g} exceeds {MAX_ENTRY}",
            attempted_range=max_entry,
        )
    n_pairs = (c_max + 1) * (2 * d_half + 1)
    if n_pairs > MAX_SCAN_PAIRS:
        raise BoundTooLargeError(
            f"bound too large: about {n_pairs:.3g} (c, d) candidates exceed "
            f"the scan cap {MAX_SCAN_PAIRS:.3g}",
            attempted_range=n_pairs,
        )
    return int(c_max)


def _scan(z, w, bound_hi, threads, tau=None, kernel=None):
    kern = kernel if kernel is not None else _kernel
    c_max = _check_scan_size(z, w, bound_hi)
    if tau is None:
        run = lambda lo, hi: kern.scan_ball(z.x, z.y, w.x, w.y, bound_hi, lo, hi)
    else:
        run = lambda lo, hi: kern.scan_trace(z.x, z.y, w.x, w.y, bound_hi, tau, lo, hi)
    if threads <= 1 or c_max < 64:
        return run(0, c_max)
    n_chunks = min(4 * threads, c_max)
    edges = np.linspace(0, c_max + 1, n_chunks + 1).astype(int)
    ranges = [(int(lo), int(hi) - 1) for lo, hi in zip(edges[:-1], edges[1:]) if hi > lo]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda r: run(r[0], r[1]), ranges))
    quads = np.concatenate([p[0] for p in parts], axis=0)
    norms = np.concatenate([p[1] for p in parts])
    return quads, norms


@dataclass
class BallSurvey:
    """Scan result around (z, w): quadruples sorted by float norm.

    ``count(X)`` resolves the step function exactly: norms inside the
    guard band around X are re-tested in rational arithmetic.
    """

    z: UpperHalfPoint
    w: UpperHalfPoint
    x_enum: float
    quads: np.ndarray
    norms: np.ndarray
    _exact: tuple = field(init=False, repr=False)

    def __post_init__(self):
        zx, zy = _exact_point(self.z)
        wx, wy = _exact_point(self.w)
        self._exact = (zx, zy, wx, wy)

    def __len__(self):
        return len(self.norms)

    def _band(self, X: float) -> float:
        return GUARD_BAND * max(1.0, X)

    def count(self, X: float) -> int:
        if X > self.x_enum * (1 + 1e-12) + self._band(X):
            raise ValueError(f"count at X={X} exceeds enumerated radius {self.x_enum}")
        band = self._band(X)
        n_sure = int(np.searchsorted(self.norms, X - band, side="right"))
        hi = int(np.searchsorted(self.norms, X + band, side="right"))
        n = n_sure
        for i in range(n_sure, hi):
            if frobnorm_exact(self.quads[i], *self._exact) <= Fraction(X):
                n += 1
        return n

    def quads_up_to(self, X: float) -> np.ndarray:
        band = self._band(X)
        n_sure = int(np.searchsorted(self.norms, X - band, side="right"))
        hi = int(np.searchsorted(self.norms, X + band, side="right"))
        keep = list(range(n_sure))
        for i in range(n_sure, hi):
            if frobnorm_exact(self.quads[i], *self._exact) <= Fraction(X):
                keep.append(i)
        return self.quads[keep]


def enumerate_survey(z, w, X: float, threads: int = 1, kernel=None) -> BallSurvey:
    """Scan the ball 2 cosh rho(z, gamma w) <= X (with guard slack)."""
    z = UpperHalfPoint.of(z)
    w = UpperHalfPoint.of(w)
    if not (X > 0 and math.isfinite(X)):
        raise ValueError(f"radius parameter must be positive and finite, got X={X}")
    bound_hi = X + GUARD_BAND * max(1.0, X)
    quads, norms = _scan(z, w, bound_hi, threads, kernel=kernel)
    order = np.argsort(norms, kind="stable")
    return BallSurvey(z, w, X, quads[order], norms[order])


def _sorted_matrices(quads: np.ndarray):
    mats = [GammaMatrix(*(int(v) for v in row)) for row in quads]
    mats.sort(key=GammaMatrix.as_tuple)
    return mats


def ball_enumerate(z, w, X: float, threads: int = 1):
    """Exactly the canonical-sign gamma with 2 cosh rho(z, gamma w) <= X.

    Sorted lexicographically by (a, b, c, d); duplicate-free.
    """
    survey = enumerate_survey(z, w, X, threads=threads)
    mats = _sorted_matrices(survey.quads_up_to(X))
    for prev, cur in zip(mats, mats[1:]):
        if prev == cur:
            raise AssertionError(f"duplicate element in enumeration: {cur}")
    return mats


def classical_count(z, w, X: float, threads: int = 1) -> int:
    """N(X; z, w) = #{gamma : 2 cosh rho(z, gamma w) <= X}."""
    if X < 2:
        # norms are >= 2, with equality only for gamma w = z
        pass
    return enumerate_survey(z, w, X, threads=threads).count(X)


@dataclass
class ClassicalSeries:
    """Error-term series for the classical count on an X grid."""

    X: np.ndarray
    N: np.ndarray
    mainterm: np.ndarray
    error: np.ndarray
    err_norm_half: np.ndarray
    err_norm_twothirds: np.ndarray
    z: UpperHalfPoint
    w: UpperHalfPoint
    main_coeff: float

    CSV_HEADER = "X,N,mainterm,error,err_norm_half,err_norm_twothirds"

    @property
    def max_norm_twothirds(self) -> float:
        return float(np.max(np.abs(self.err_norm_twothirds)))

    def to_csv(self, path):
        with open(path, "w") as fh:
            fh.write(self.CSV_HEADER + "\n")
            for i in range(len(self.X)):
                row = (
                    self.X[i],
                    self.N[i],
                    self.mainterm[i],
                    self.error[i],
                    self.err_norm_half[i],
                    self.err_norm_twothirds[i],
                )
                fh.write(",".join(f"{v:.12g}" for v in row) + "\n")


def classical_error_series(z, w, x_grid, main_coeff: float = 3.0, threads: int = 1) -> ClassicalSeries:
    """E(X; z, w) = N(X; z, w) - main_coeff * X on an ascending grid.

    main_coeff defaults to the modular-group main term 3X (unit mass at
    the volume pi/3); callers supply the coefficient for other settings.
    """
    x_grid = np.asarray(x_grid, dtype=float)
    if len(x_grid) == 0 or np.any(np.diff(x_grid) <= 0):
        raise ValueError("X grid must be nonempty and strictly ascending")
    z = UpperHalfPoint.of(z)
    w = UpperHalfPoint.of(w)
    survey = enumerate_survey(z, w, float(x_grid[-1]), threads=threads)
    counts = np.array([survey.count(float(x)) for x in x_grid], dtype=float)
    mainterm = main_coeff * x_grid
    err = counts - mainterm
    return ClassicalSeries(
        X=x_grid,
        N=counts,
        mainterm=mainterm,
        error=err,
        err_norm_half=err / np.sqrt(x_grid),
        err_norm_twothirds=err / x_grid ** (2.0 / 3.0),
        z=z,
        w=w,
        main_coeff=main_coeff,
    )


# ---------------------------------------------------------------------------
# enumeration cache


@dataclass
class BallCache:
    z: UpperHalfPoint
    w: UpperHalfPoint
    X: float
    matrices: list
    version: int = CACHE_VERSION


def cache_store(path, cache: BallCache):
    with open(path, "w") as fh:
        fh.write("# hypcount ball cache\n")
        fh.write(f"version {cache.version}\n")
        fh.write(f"z {cache.z.x!r} {cache.z.y!r}\n")
        fh.write(f"w {cache.w.x!r} {cache.w.y!r}\n")
        fh.write(f"X {cache.X!r}\n")
        fh.write(f"count {len(cache.matrices)}\n")
        for m in cache.matrices:
            fh.write(f"{m.a} {m.b} {m.c} {m.d}\n")


def _cache_header_line(fh, key):
    line = fh.readline()
    parts = line.split()
    if not parts or parts[0] != key:
        raise CacheFormatError(f"malformed header: expected '{key}', got {line!r}")
    return parts[1:]


def cache_load(path) -> BallCache:
    with open(path) as fh:
        magic = fh.readline()
        if not magic.startswith("# hypcount ball cache"):
            raise CacheFormatError(f"not a ball cache file: {magic!r}")
        (ver,) = _cache_header_line(fh, "version")
        if int(ver) != CACHE_VERSION:
            raise CacheVersionError(f"unsupported cache version {ver}")
        zx, zy = _cache_header_line(fh, "z")
        wx, wy = _cache_header_line(fh, "w")
        (xs,) = _cache_header_line(fh, "X")
        (cnt,) = _cache_header_line(fh, "count")
        n = int(cnt)
        mats = []
        prev = None
        for i in range(n):
            line = fh.readline()
            parts = line.split()
            if len(parts) != 4:
                raise CacheFormatError(f"malformed row {i}: {line!r}")
            try:
                a, b, c, d = (int(p) for p in parts)
            except ValueError as exc:
                raise CacheFormatError(f"malformed row {i}: {line!r}") from exc
            if a * d - b * c != 1:
                raise CacheInvariantError(f"row {i} has determinant != 1: {parts}")
            if c < 0 or (c == 0 and a < 0):
                raise CacheInvariantError(f"row {i} violates canonical sign: {parts}")
            cur = (a, b, c, d)
            if prev is not None and cur <= prev:
                raise CacheInvariantError(f"rows not sorted/duplicate-free at row {i}")
            prev = cur
            mats.append(GammaMatrix(a, b, c, d))
    return BallCache(
        z=UpperHalfPoint(float(zx), float(zy)),
        w=UpperHalfPoint(float(wx), float(wy)),
        X=float(xs),
        matrices=mats,
    )
