"""Exact dense linear algebra over prime fields F_p (p odd) and the rationals.

Matrices are immutable.  Over F_p the entries live in a numpy integer array
reduced mod p; over Q they live in an object array of ``fractions.Fraction``.
All elimination uses the same deterministic pivot rule: within a column, the
first nonzero entry scanning top to bottom.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

# Products of two reduced entries plus a few thousand accumulated terms must fit in int64.
_INT64_PRIME_LIMIT = 1 << 26


class FieldError(ValueError):
    """Unsupported or malformed field specification."""


class DimensionError(ValueError):
    """Matrix shapes do not fit together."""


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_prime(p: int) -> bool:
    """Miller-Rabin with the first twelve primes as bases; deterministic
    below 3.3e24, which covers every characteristic used here."""
    if p < 2:
        return False
    for q in _MR_BASES:
        if p % q == 0:
            return p == q
    d, s = p - 1, 0
    while d % 2 == 0:
        d, s = d // 2, s + 1
    for a in _MR_BASES:
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Either the prime field F_p (``p`` an odd prime) or Q (``p is None``)."""

    p: int | None = None

    def __post_init__(self):
        if self.p is None:
            return
        if not isinstance(self.p, (int, np.integer)) or isinstance(self.p, bool):
            raise FieldError(f"characteristic must be an integer, got {self.p!r}")
        if self.p == 2:
            raise FieldError("characteristic 2 is not supported")
        if not _is_prime(int(self.p)):
            raise FieldError(f"{self.p} is not prime")
        object.__setattr__(self, "p", int(self.p))

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(p)

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(None)

    @property
    def is_prime_field(self) -> bool:
        return self.p is not None

    @property
    def dtype(self):
        if self.p is not None and self.p < _INT64_PRIME_LIMIT:
            return np.int64
        return object

    def __str__(self) -> str:
        return "QQ" if self.p is None else f"GF({self.p})"

    # -- scalars -----------------------------------------------------------
    def scalar(self, x):
        """Canonical representative of ``x`` (int, Fraction, or "a/b" string)."""
        if self.p is None:
            return Fraction(x)
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has no image in {self}")
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def inv(self, x):
        if self.p is None:
            return Fraction(1) / x
        return pow(int(x), -1, self.p)

    # -- arrays ------------------------------------------------------------
    def array(self, data, shape=None) -> np.ndarray:
        if self.p is None:
            src = np.asarray(data, dtype=object)
            if shape is not None:
                src = src.reshape(shape)
            out = np.empty(src.shape, dtype=object)
            flat = out.reshape(-1)
            for k, v in enumerate(src.reshape(-1)):
                flat[k] = Fraction(v)
            return out
        if self.dtype is object:
            src = np.asarray(data, dtype=object)
            if shape is not None:
                src = src.reshape(shape)
            return np.vectorize(self.scalar, otypes=[object])(src) if src.size else src.astype(object)
        src = np.asarray(data)
        if shape is not None:
            src = src.reshape(shape)
        if src.dtype == object or src.dtype.kind not in "iu":
            if src.size == 0:
                return np.zeros(src.shape, dtype=np.int64)
            return np.vectorize(self.scalar, otypes=[np.int64])(src)
        return np.mod(src.astype(np.int64), self.p)

    def reduce(self, a: np.ndarray) -> np.ndarray:
        if self.p is None:
            return a
        return np.mod(a, self.p)

    def zeros(self, shape) -> np.ndarray:
        if self.p is None:
            out = np.empty(shape, dtype=object)
            out.fill(Fraction(0))
            return out
        return np.zeros(shape, dtype=self.dtype)

    def random(self, rng: np.random.Generator, shape, bound: int = 10) -> np.ndarray:
        """Uniform entries over F_p; over Q, integers in [-bound, bound]."""
        if self.p is None:
            return self.array(rng.integers(-bound, bound + 1, size=shape))
        if self.dtype is object:
            return np.array(
                [int(v) for v in rng.integers(0, self.p, size=int(np.prod(shape)))], dtype=object
            ).reshape(shape)
        return rng.integers(0, self.p, size=shape, dtype=np.int64)


GF = FieldSpec.prime
QQ = FieldSpec(None)
DEFAULT_FIELD = FieldSpec(32003)


def _rref(a: np.ndarray, field: FieldSpec) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of a copy of ``a``; returns (R, pivot columns)."""
    a = a.copy()
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = field.reduce(a[r] * field.inv(a[r, c]))
        col = a[:, c].copy()
        col[r] = 0
        others = np.flatnonzero(col)
        if others.size:
            a[others] = field.reduce(a[others] - np.outer(col[others], a[r]))
        pivots.append(c)
        r += 1
    return a, pivots


class Matrix:
    """Immutable dense matrix over a :class:`FieldSpec`."""

    __slots__ = ("field", "_a")

    def __init__(self, field: FieldSpec, data, shape=None, *, _trusted: bool = False):
        self.field = field
        a = data if _trusted else field.array(data, shape)
        if a.ndim != 2:
            if a.size == 0 and shape is None:
                a = a.reshape(0, 0)
            else:
                raise DimensionError(f"expected a 2-d grid, got shape {a.shape}")
        a.flags.writeable = False
        self._a = a

    # -- construction ------------------------------------------------------
    @classmethod
    def _wrap(cls, field: FieldSpec, a: np.ndarray) -> "Matrix":
        return cls(field, a, _trusted=True)

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "Matrix":
        return cls._wrap(field, field.zeros((rows, cols)))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        a = field.zeros((n, n))
        for i in range(n):
            a[i, i] = 1 if field.p is not None else Fraction(1)
        return cls._wrap(field, a)

    @classmethod
    def unit(cls, field: FieldSpec, rows: int, cols: int, i: int, j: int) -> "Matrix":
        """Matrix unit E_{ij} (0-based)."""
        a = field.zeros((rows, cols))
        a[i, j] = 1 if field.p is not None else Fraction(1)
        return cls._wrap(field, a)

    @classmethod
    def random(cls, field: FieldSpec, rows: int, cols: int, rng: np.random.Generator) -> "Matrix":
        return cls._wrap(field, field.random(rng, (rows, cols)))

    @classmethod
    def column(cls, field: FieldSpec, values: Sequence) -> "Matrix":
        return cls(field, np.asarray(list(values), dtype=object).reshape(len(values), 1))

    # -- basic accessors ---------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape

    @property
    def nrows(self) -> int:
        return self._a.shape[0]

    @property
    def ncols(self) -> int:
        return self._a.shape[1]

    @property
    def array(self) -> np.ndarray:
        """Read-only view of the underlying entries."""
        return self._a

    def __getitem__(self, idx):
        if isinstance(idx, tuple) and all(isinstance(i, (int, np.integer)) for i in idx):
            v = self._a[idx]
            return v if self.field.p is None else int(v)
        sub = self._a[idx]
        if sub.ndim != 2:
            raise IndexError("use two slices (or two integers) to index a Matrix")
        return Matrix._wrap(self.field, sub.copy())

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "Matrix":
        return Matrix._wrap(self.field, self._a[r0:r1, c0:c1].copy())

    def tolist(self) -> list[list]:
        if self.field.p is None:
            return [[_fraction_json(v) for v in row] for row in self._a]
        return [[int(v) for v in row] for row in self._a]

    def __repr__(self) -> str:
        return f"Matrix({self.field}, {self.tolist()})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.field == other.field
            and self.shape == other.shape
            and bool(np.all(self._a == other._a))
        )

    def __hash__(self):
        return hash((self.field, self.shape, tuple(self._a.reshape(-1).tolist())))

    def is_zero(self) -> bool:
        return not np.any(self._a != 0)

    # -- arithmetic --------------------------------------------------------
    def _check_field(self, other: "Matrix"):
        if self.field != other.field:
            raise FieldError(f"field mismatch: {self.field} vs {other.field}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check_field(other)
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        if self.ncols == 0:
            return Matrix.zeros(self.field, self.nrows, other.ncols)
        return Matrix._wrap(self.field, self.field.reduce(self._a @ other._a))

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_field(other)
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        return Matrix._wrap(self.field, self.field.reduce(self._a + other._a))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_field(other)
        if self.shape != other.shape:
            raise DimensionError(f"cannot subtract {self.shape} and {other.shape}")
        return Matrix._wrap(self.field, self.field.reduce(self._a - other._a))

    def __neg__(self) -> "Matrix":
        return Matrix._wrap(self.field, self.field.reduce(-self._a))

    def scale(self, c) -> "Matrix":
        c = self.field.scalar(c)
        return Matrix._wrap(self.field, self.field.reduce(self._a * c))

    def __rmul__(self, c) -> "Matrix":
        return self.scale(c)

    @property
    def T(self) -> "Matrix":
        return Matrix._wrap(self.field, self._a.T.copy())

    # -- elimination -------------------------------------------------------
    def rref(self) -> tuple["Matrix", list[int]]:
        r, piv = _rref(self._a, self.field)
        return Matrix._wrap(self.field, r), piv

    def rank(self) -> int:
        if self._a.size == 0:
            return 0
        return len(_rref(self._a, self.field)[1])

    def kernel(self) -> "Matrix":
        """Kernel basis as the columns of a matrix (cols x nullity)."""
        rows, cols = self.shape
        if self._a.size == 0:
            return Matrix.identity(self.field, cols)
        r, piv = _rref(self._a, self.field)
        free = [c for c in range(cols) if c not in set(piv)]
        k = self.field.zeros((cols, len(free)))
        one = 1 if self.field.p is not None else Fraction(1)
        for j, f in enumerate(free):
            k[f, j] = one
            for i, pc in enumerate(piv):
                k[pc, j] = -r[i, f]
        return Matrix._wrap(self.field, self.field.reduce(k))

    def kernel_basis(self) -> list["Matrix"]:
        k = self.kernel()
        return [k.block(0, k.nrows, j, j + 1) for j in range(k.ncols)]

    def colspace(self) -> "Matrix":
        """Canonical basis (reduced echelon) of the column space, as columns."""
        if self._a.size == 0:
            return Matrix.zeros(self.field, self.nrows, 0)
        r, piv = _rref(self._a.T, self.field)
        return Matrix._wrap(self.field, r[: len(piv)].T.copy())

    def inverse(self) -> "Matrix":
        n, m = self.shape
        if n != m:
            raise DimensionError("only square matrices are invertible")
        aug = np.concatenate([self._a, Matrix.identity(self.field, n)._a], axis=1)
        r, piv = _rref(aug, self.field)
        if piv[:n] != list(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return Matrix._wrap(self.field, r[:, n:].copy())

    def det(self):
        n, m = self.shape
        if n != m:
            raise DimensionError("determinant needs a square matrix")
        a = self._a.copy()
        f = self.field
        det = 1 if f.p is not None else Fraction(1)
        for c in range(n):
            nz = np.flatnonzero(a[c:, c])
            if nz.size == 0:
                return 0 if f.p is not None else Fraction(0)
            piv = c + int(nz[0])
            if piv != c:
                a[[c, piv]] = a[[piv, c]]
                det = -det
            det = det * a[c, c]
            if f.p is not None:
                det %= f.p
            inv = f.inv(a[c, c])
            below = a[c + 1 :, c].copy()
            a[c + 1 :] = f.reduce(a[c + 1 :] - np.outer(below * inv, a[c]))
        return int(det) if f.p is not None else det

    def solve(self, rhs: "Matrix") -> "Matrix":
        """One solution X of self @ X = rhs; raises ValueError if inconsistent."""
        self._check_field(rhs)
        if rhs.nrows != self.nrows:
            raise DimensionError("right-hand side has the wrong number of rows")
        n = self.ncols
        aug = np.concatenate([self._a, rhs._a], axis=1)
        r, piv = _rref(aug, self.field)
        if any(p >= n for p in piv):
            raise ValueError("inconsistent linear system")
        x = self.field.zeros((n, rhs.ncols))
        for i, pc in enumerate(piv):
            x[pc] = r[i, n:]
        return Matrix._wrap(self.field, x)


def _fraction_json(v: Fraction):
    return int(v) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


# -- module-level helpers ------------------------------------------------------

def rank(m: Matrix) -> int:
    return m.rank()


def kernel_basis(m: Matrix) -> list[Matrix]:
    return m.kernel_basis()


def hstack(mats: Sequence[Matrix], field: FieldSpec | None = None, rows: int | None = None) -> Matrix:
    if not mats:
        if field is None or rows is None:
            raise DimensionError("empty hstack needs field and row count")
        return Matrix.zeros(field, rows, 0)
    f = mats[0].field
    if any(m.field != f for m in mats):
        raise FieldError("field mismatch in hstack")
    if len({m.nrows for m in mats}) != 1:
        raise DimensionError(f"row counts differ: {[m.nrows for m in mats]}")
    return Matrix._wrap(f, np.concatenate([m.array for m in mats], axis=1))


def vstack(mats: Sequence[Matrix], field: FieldSpec | None = None, cols: int | None = None) -> Matrix:
    if not mats:
        if field is None or cols is None:
            raise DimensionError("empty vstack needs field and column count")
        return Matrix.zeros(field, 0, cols)
    f = mats[0].field
    if any(m.field != f for m in mats):
        raise FieldError("field mismatch in vstack")
    if len({m.ncols for m in mats}) != 1:
        raise DimensionError(f"column counts differ: {[m.ncols for m in mats]}")
    return Matrix._wrap(f, np.concatenate([m.array for m in mats], axis=0))


def block_compose(grid: Sequence[Sequence[Matrix]]) -> Matrix:
    """Assemble a block matrix; every block row must share heights and every
    block column widths."""
    if not grid or not grid[0]:
        raise DimensionError("empty block grid")
    ncol = len(grid[0])
    if any(len(row) != ncol for row in grid):
        raise DimensionError("ragged block grid")
    heights = [row[0].nrows for row in grid]
    widths = [grid[0][j].ncols for j in range(ncol)]
    for i, row in enumerate(grid):
        for j, blk in enumerate(row):
            if blk.shape != (heights[i], widths[j]):
                raise DimensionError(
                    f"block ({i},{j}) has shape {blk.shape}, expected {(heights[i], widths[j])}"
                )
    return vstack([hstack(list(row)) for row in grid])


def extract_blocks(m: Matrix, row_sizes: Sequence[int], col_sizes: Sequence[int]) -> list[list[Matrix]]:
    """Inverse of :func:`block_compose` for the given border sizes."""
    if sum(row_sizes) != m.nrows or sum(col_sizes) != m.ncols:
        raise DimensionError(f"borders {row_sizes} x {col_sizes} do not tile {m.shape}")
    ro = np.concatenate([[0], np.cumsum(row_sizes)]).astype(int)
    co = np.concatenate([[0], np.cumsum(col_sizes)]).astype(int)
    return [
        [m.block(ro[i], ro[i + 1], co[j], co[j + 1]) for j in range(len(col_sizes))]
        for i in range(len(row_sizes))
    ]


def block_diag(mats: Iterable[Matrix], field: FieldSpec) -> Matrix:
    mats = list(mats)
    rows = sum(m.nrows for m in mats)
    cols = sum(m.ncols for m in mats)
    a = field.zeros((rows, cols))
    r = c = 0
    for m in mats:
        a[r : r + m.nrows, c : c + m.ncols] = m.array
        r += m.nrows
        c += m.ncols
    return Matrix._wrap(field, a)


def random_invertible(field: FieldSpec, n: int, rng: np.random.Generator) -> Matrix:
    while True:
        m = Matrix.random(field, n, n, rng)
        if m.rank() == n:
            return m


def kron(a: Matrix, b: Matrix) -> Matrix:
    if a.field != b.field:
        raise FieldError("field mismatch in kron")
    return Matrix._wrap(a.field, a.field.reduce(np.kron(a.array, b.array)))
