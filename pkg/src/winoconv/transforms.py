"""Winograd minimal filtering: transform synthesis and single-tile algorithms.

A minimal 1D algorithm F(m, r) computes m outputs of a valid (no padding)
convolution with an r-tap filter using only m+r-1 multiplications:

    y = A^T [(B^T d) . (G g)]

where d has alpha = m+r-1 samples, g has r taps, "." is element-wise, and
A (alpha x m), B (alpha x alpha), G (alpha x r) are constant matrices.
Nesting the 1D form gives the 2D algorithm on alpha x alpha input tiles:

    Y = A^T [(B^T d B) . (G g G^T)] A

The constant matrices are synthesized from a set of distinct interpolation
points via polynomial evaluation/interpolation (Cook-Toom), carried out in
exact rational arithmetic.  Floating-point copies are derived at the end.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

RationalMatrix = tuple[tuple[Fraction, ...], ...]

TILE_ROLES = ("input", "kernel", "transformed", "output")


class MultCounter:
    """Instrumented counter for element-wise (Hadamard) multiplications."""

    def __init__(self):
        self.count = 0

    def add(self, n: int):
        self.count += int(n)

    def reset(self):
        self.count = 0


@dataclass(frozen=True)
class MinimalParams:
    """The (m, r) pair selecting one minimal filtering algorithm.

    m: output tile size per dimension, r: kernel size per dimension.
    The input tile size alpha = m + r - 1 is always derived.
    """

    m: int
    r: int

    def __post_init__(self):
        if self.m < 1 or self.r < 1:
            raise ValueError(f"m and r must be >= 1, got m={self.m}, r={self.r}")

    @property
    def alpha(self) -> int:
        return self.m + self.r - 1


@dataclass(frozen=True)
class TransformSet:
    """Constant matrices of one minimal algorithm, exact and as float64.

    a: inverse transform (alpha x m), b: data transform (alpha x alpha),
    g: filter transform (alpha x r).  The *_exact fields hold the rational
    matrices the floats were derived from.  interpolation_points lists the
    finite synthesis points; the last evaluation point is always the point
    at infinity and is not stored.  Instances are immutable and safe to
    share across threads.
    """

    params: MinimalParams
    a: np.ndarray
    b: np.ndarray
    g: np.ndarray
    a_exact: RationalMatrix
    b_exact: RationalMatrix
    g_exact: RationalMatrix
    interpolation_points: tuple[Fraction, ...]

    @property
    def at(self) -> np.ndarray:
        return self.a.T

    @property
    def bt(self) -> np.ndarray:
        return self.b.T


@dataclass(frozen=True)
class Tile2D:
    """A 2D tile with a declared role, checked against MinimalParams.

    Roles: 'input' (alpha x alpha), 'kernel' (r x r),
    'transformed' (alpha x alpha), 'output' (m x m).
    """

    data: np.ndarray
    role: str

    def __post_init__(self):
        if self.role not in TILE_ROLES:
            raise ValueError(f"unknown tile role {self.role!r}")
        if np.ndim(self.data) != 2:
            raise ValueError("tile data must be a 2D matrix")

    def expected_shape(self, params: MinimalParams) -> tuple[int, int]:
        a = params.alpha
        side = {"input": a, "kernel": params.r, "transformed": a, "output": params.m}[self.role]
        return (side, side)

    def validate(self, params: MinimalParams):
        want = self.expected_shape(params)
        if tuple(self.data.shape) != want:
            raise ValueError(
                f"{self.role} tile must be {want[0]}x{want[1]} for "
                f"F({params.m},{params.r}), got {self.data.shape}"
            )


def default_points(n: int) -> tuple[Fraction, ...]:
    """First n points of the sequence 0, 1, -1, 2, -2, 1/2, -1/2, 3, -3, 1/3, ...

    Small-magnitude points keep the transform constants small; the mix of
    integers and reciprocals delays the growth of Lagrange coefficients.
    """
    pts: list[Fraction] = [Fraction(0)]
    k = 1
    while len(pts) < n:
        pts.append(Fraction(k))
        pts.append(Fraction(-k))
        if k > 1:
            pts.append(Fraction(1, k))
            pts.append(Fraction(-1, k))
        k += 1
    return tuple(pts[:n])


def _poly_mul(p: list[Fraction], q: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, pa in enumerate(p):
        for j, qb in enumerate(q):
            out[i + j] += pa * qb
    return out


def _freeze(rows: Iterable[Iterable[Fraction]]) -> RationalMatrix:
    return tuple(tuple(row) for row in rows)


def _to_float(mat: RationalMatrix) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in mat], dtype=np.float64)


def generate_transforms(
    params: MinimalParams, points: Sequence[Fraction | int] | None = None
) -> TransformSet:
    """Synthesize the A, B, G matrices for F(m, r).

    Uses m+r-2 distinct rational points plus the implicit point at infinity.
    Per finite point i the rows are built from the Lagrange basis polynomial
    L_i: the B^T row holds L_i's coefficients scaled to a primitive integer
    vector, the G row holds the Vandermonde powers of the point divided by
    the same scale (fractions end up in the filter transform, which is the
    precomputable one), and the A row holds the plain Vandermonde powers.
    The infinity row extracts leading coefficients.  With the default points
    {0, 1, -1} this reproduces the classical F(2,3) matrices exactly.

    m == 1 has no interpolation stage: the algorithm degenerates to a plain
    dot product (B = G = I, A = column of ones).
    """
    m, r = params.m, params.r
    alpha = params.alpha

    if m == 1:
        if points is not None:
            raise ValueError("F(1, r) is a plain dot product; it takes no points")
        eye = tuple(
            tuple(Fraction(1 if i == j else 0) for j in range(r)) for i in range(r)
        )
        ones = tuple((Fraction(1),) for _ in range(r))
        return TransformSet(
            params=params,
            a=_to_float(ones), b=_to_float(eye), g=_to_float(eye),
            a_exact=ones, b_exact=eye, g_exact=eye,
            interpolation_points=(),
        )

    if points is None:
        pts = list(default_points(alpha - 1))
    else:
        pts = [Fraction(p) for p in points]
    if len(pts) != alpha - 1:
        raise ValueError(
            f"F({m},{r}) needs {alpha - 1} finite points (plus infinity), got {len(pts)}"
        )
    if len(set(pts)) != len(pts):
        raise ValueError(f"interpolation points must be distinct, got {pts}")

    bt_rows: list[list[Fraction]] = []
    g_rows: list[list[Fraction]] = []
    a_rows: list[list[Fraction]] = []
    for i, ai in enumerate(pts):
        numer = [Fraction(1)]
        denom = Fraction(1)
        for k, ak in enumerate(pts):
            if k == i:
                continue
            numer = _poly_mul(numer, [-ak, Fraction(1)])
            denom *= ai - ak
        basis = [c / denom for c in numer] + [Fraction(0)]  # degree < alpha-1, padded
        dens = [c.denominator for c in basis if c != 0]
        nums = [abs(c.numerator) for c in basis if c != 0]
        scale = Fraction(lcm(*dens), gcd(*nums))  # positive, makes the row primitive
        bt_rows.append([c * scale for c in basis])
        g_rows.append([ai**j / scale for j in range(r)])
        a_rows.append([ai**j for j in range(m)])

    # Point at infinity: the product's leading coefficient.  The row is the
    # coefficient vector of prod(a_i - x); its sign is compensated in A.
    pi = [Fraction(1)]
    for ak in pts:
        pi = _poly_mul(pi, [-ak, Fraction(1)])
    sign = Fraction(-1) ** (alpha - 1)
    bt_rows.append([sign * c for c in pi])
    g_rows.append([Fraction(0)] * (r - 1) + [Fraction(1)])
    a_rows.append([Fraction(0)] * (m - 1) + [sign])

    b_exact = _freeze(zip(*bt_rows))  # stored as B, not B^T
    g_exact = _freeze(g_rows)
    a_exact = _freeze(a_rows)
    return TransformSet(
        params=params,
        a=_to_float(a_exact), b=_to_float(b_exact), g=_to_float(g_exact),
        a_exact=a_exact, b_exact=b_exact, g_exact=g_exact,
        interpolation_points=tuple(pts),
    )


def _tile_array(x, params: MinimalParams, role: str) -> np.ndarray:
    if isinstance(x, Tile2D):
        if x.role != role:
            raise ValueError(f"expected a {role!r} tile, got role {x.role!r}")
        x.validate(params)
        return x.data
    return np.asarray(x)


def winograd_1d(ts: TransformSet, d, g, counter: MultCounter | None = None) -> np.ndarray:
    """One 1D minimal-filtering pass: valid convolution of d (len alpha) with g (len r).

    Spends exactly alpha multiplications in the element-wise stage.
    """
    d = np.asarray(d, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    alpha, r = ts.params.alpha, ts.params.r
    if d.shape != (alpha,):
        raise ValueError(f"data vector must have length {alpha}, got {d.shape}")
    if g.shape != (r,):
        raise ValueError(f"filter vector must have length {r}, got {g.shape}")
    u = ts.b.T @ d
    v = ts.g @ g
    if counter is not None:
        counter.add(alpha)
    return ts.a.T @ (u * v)


def filter_transform_2d(ts: TransformSet, g) -> np.ndarray:
    """V = G g G^T, mapping an r x r kernel to the alpha x alpha domain."""
    g = _tile_array(g, ts.params, "kernel")
    r = ts.params.r
    if g.shape != (r, r):
        raise ValueError(f"kernel tile must be {r}x{r}, got {g.shape}")
    return ts.g @ g @ ts.g.T


def data_transform_2d(ts: TransformSet, d) -> np.ndarray:
    """U = B^T d B on an alpha x alpha input tile."""
    d = _tile_array(d, ts.params, "input")
    alpha = ts.params.alpha
    if d.shape != (alpha, alpha):
        raise ValueError(f"input tile must be {alpha}x{alpha}, got {d.shape}")
    return ts.b.T @ d @ ts.b


def inverse_transform_2d(ts: TransformSet, mtile) -> np.ndarray:
    """Y = A^T M A, collapsing an alpha x alpha product tile to m x m outputs."""
    mtile = _tile_array(mtile, ts.params, "transformed")
    alpha = ts.params.alpha
    if mtile.shape != (alpha, alpha):
        raise ValueError(f"transformed tile must be {alpha}x{alpha}, got {mtile.shape}")
    return ts.a.T @ mtile @ ts.a


def winograd_2d_tile(ts: TransformSet, d, g, counter: MultCounter | None = None) -> np.ndarray:
    """Full 2D minimal algorithm on one tile; alpha^2 element-wise multiplications."""
    u = data_transform_2d(ts, d)
    v = filter_transform_2d(ts, g)
    if counter is not None:
        counter.add(ts.params.alpha ** 2)
    return inverse_transform_2d(ts, u * v)


# Exact (rational) mode: same algorithms on Fraction matrices.  Outputs are
# bit-identical to brute-force convolution, which makes the correctness
# identity testable without floating-point tolerances.

def _mat_exact(x, rows: int, cols: int, what: str) -> list[list[Fraction]]:
    m = [[Fraction(v) for v in row] for row in x]
    if len(m) != rows or any(len(row) != cols for row in m):
        raise ValueError(f"{what} must be {rows}x{cols}")
    return m


def _matmul_exact(a, b):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def _transpose(m):
    return [list(row) for row in zip(*m)]


def winograd_1d_exact(ts: TransformSet, d, g) -> tuple[Fraction, ...]:
    """Rational-arithmetic winograd_1d; d and g are sequences of rationals."""
    alpha, r = ts.params.alpha, ts.params.r
    dv = [Fraction(x) for x in d]
    gv = [Fraction(x) for x in g]
    if len(dv) != alpha or len(gv) != r:
        raise ValueError(f"need len(d)={alpha} and len(g)={r}")
    u = [sum(x * y for x, y in zip(col, dv)) for col in _transpose(ts.b_exact)]
    v = [sum(x * y for x, y in zip(row, gv)) for row in ts.g_exact]
    prod = [ui * vi for ui, vi in zip(u, v)]
    return tuple(
        sum(x * y for x, y in zip(col, prod)) for col in _transpose(ts.a_exact)
    )


def winograd_2d_tile_exact(ts: TransformSet, d, g) -> tuple[tuple[Fraction, ...], ...]:
    """Rational-arithmetic winograd_2d_tile; d is alpha x alpha, g is r x r."""
    alpha, r = ts.params.alpha, ts.params.r
    dm = _mat_exact(d, alpha, alpha, "input tile")
    gm = _mat_exact(g, r, r, "kernel tile")
    bt = _transpose(ts.b_exact)
    at = _transpose(ts.a_exact)
    u = _matmul_exact(_matmul_exact(bt, dm), [list(row) for row in ts.b_exact])
    v = _matmul_exact(_matmul_exact([list(r_) for r_ in ts.g_exact], gm),
                      _transpose(ts.g_exact))
    m = [[u[i][j] * v[i][j] for j in range(alpha)] for i in range(alpha)]
    y = _matmul_exact(_matmul_exact(at, m), [list(row) for row in ts.a_exact])
    return _freeze(y)


def export_transforms_csv(ts: TransformSet, directory) -> list[Path]:
    """Write a.csv, b.csv, g.csv (row-major, exact rationals as 'p/q')."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, mat in (("a", ts.a_exact), ("b", ts.b_exact), ("g", ts.g_exact)):
        path = directory / f"{name}.csv"
        lines = [",".join(str(x) for x in row) for row in mat]
        path.write_text("\n".join(lines) + "\n")
        written.append(path)
    return written


def format_transforms(ts: TransformSet) -> str:
    """Human-readable dump of B^T, G, A^T with exact entries."""
    p = ts.params

    def fmt(rows, label):
        cells = [[str(x) for x in row] for row in rows]
        width = max(len(c) for row in cells for c in row)
        body = "\n".join("  [" + " ".join(c.rjust(width) for c in row) + "]" for row in cells)
        return f"{label} =\n{body}"

    pts = ", ".join(str(x) for x in ts.interpolation_points) + ", inf" \
        if ts.interpolation_points else "(none: dot-product form)"
    return "\n".join([
        f"F({p.m}x{p.m}, {p.r}x{p.r})  alpha={p.alpha}  points: {pts}",
        fmt(_transpose(ts.b_exact), "B^T"),
        fmt(ts.g_exact, "G"),
        fmt(_transpose(ts.a_exact), "A^T"),
    ])
