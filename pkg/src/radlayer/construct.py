"""Explicit witness representations of the local algebra.

Blocks follow the adapted convention: x_i = [[0, A_i, B_i], [0, 0, C_i], [0, 0, 0]]
with diagonal blocks of sizes d2, d1, d0.  The generator families are written
for S = sum x_i^2 and transported to other Gram matrices by the inverse of
the normalising substitution.
"""

from __future__ import annotations

import logging
from typing import Sequence

import numpy as np

from .algebra import LocalAlgebra, denormalize_tuple, make_local_algebra, normalize_tuple
from .exactmat import DEFAULT_FIELD, FieldSpec, Matrix, block_diag, hstack
from .layering import DecompositionError, _require_nonempty, root_decompose
from .rep import Representation, raddim, zero_rep
from .sampler import assemble_local, random_entries, relation_kernel_C

log = logging.getLogger(__name__)


class WitnessSearchError(RuntimeError):
    """witness_any ran out of retries."""


def _unit(f: FieldSpec, rows: int, cols: int, i: int, j: int) -> Matrix:
    return Matrix.unit(f, rows, cols, i, j)


def _zero_tuple(f: FieldSpec, n: int, rows: int, cols: int) -> list[Matrix]:
    return [Matrix.zeros(f, rows, cols) for _ in range(n)]


def dim1_tuples(n: int, m: int, d0: int, f: FieldSpec) -> tuple[list[Matrix], list[Matrix]]:
    """(A, C) for layering (d0, 1, m): A = (e_1, ..., e_m) as an m x 1 tuple,
    C_{m+1} = (1, 0, ..., 0)."""
    if not 0 <= m <= n - 1:
        raise ValueError(f"need 0 <= m <= n-1, got m={m}, n={n}")
    if d0 < 1:
        raise ValueError("need d0 >= 1")
    A = _zero_tuple(f, n, m, 1)
    for i in range(m):
        A[i] = _unit(f, m, 1, i, 0)
    C = _zero_tuple(f, n, 1, d0)
    C[m] = _unit(f, 1, d0, 0, 0)
    return A, C


def dimgt1_A(n: int, m: int, f: FieldSpec) -> list[Matrix]:
    """The (mn-1) x m tuple: I_m stacked for x_1 .. x_{n-1}, and for x_n an
    identity in the bottom m rows plus units at rows i+2+m*i (1-based) of
    the first column, i = 0 .. m-3."""
    rows = m * n - 1
    A = []
    for i in range(n - 1):
        a = f.zeros((rows, m))
        for k in range(m):
            a[m * i + k, k] = 1
        A.append(Matrix._wrap(f, a))
    a = f.zeros((rows, m))
    off = m * (n - 1) - 1
    for k in range(m):
        a[off + k, k] = 1
    for i in range(m - 2):
        a[i + 1 + m * i, 0] = 1
    A.append(Matrix._wrap(f, a))
    return A


def dimgt1_C(n: int, m: int, d0: int, f: FieldSpec) -> list[Matrix]:
    """m x d0 tuple supported on the first column:
    (-x_n, x_1, ..., x_{m-2}, x_{n-1})^T."""
    C = _zero_tuple(f, n, m, d0)
    one = f.scalar(1)
    C[n - 1] = _unit(f, m, d0, 0, 0).scale(-one)
    for j in range(m - 2):
        C[j] = _unit(f, m, d0, j + 1, 0)
    C[n - 2] = C[n - 2] + _unit(f, m, d0, m - 1, 0)
    return C


def _from_standard(alg: LocalAlgebra, A: Sequence[Matrix], B: Sequence[Matrix], C: Sequence[Matrix], *, check=True):
    """Build the rep from a standard-form triple (sum A_i C_i = 0)."""
    A = A if alg.is_standard else denormalize_tuple(alg, A)
    return assemble_local(alg, A, B, C, check=check)


def witness_dim1(n: int, m: int, d0: int, field: FieldSpec = DEFAULT_FIELD, *, gram=None) -> Representation:
    """Representation with radical layering (d0, 1, m), 0 <= m <= n-1."""
    alg = make_local_algebra(n, gram, field)
    A, C = dim1_tuples(n, m, d0, alg.field)
    B = _zero_tuple(alg.field, n, m, d0)
    return _from_standard(alg, A, B, C)


def witness_dimgt1(n: int, m: int, d0: int, field: FieldSpec = DEFAULT_FIELD, *, gram=None) -> Representation:
    """Representation with radical layering (d0, m, mn-1), 2 <= m <= n."""
    if not 2 <= m <= n:
        raise ValueError(f"need 2 <= m <= n, got m={m}, n={n}")
    if d0 < 1:
        raise ValueError("need d0 >= 1")
    alg = make_local_algebra(n, gram, field)
    f = alg.field
    A = dimgt1_A(n, m, f)
    C = dimgt1_C(n, m, d0, f)
    B = _zero_tuple(f, n, m * n - 1, d0)
    return _from_standard(alg, A, B, C)


def witness_exceptional(n: int, a: int, field: FieldSpec = DEFAULT_FIELD, *, gram=None) -> Representation:
    """Representation of dimension (n^2+n)(a-1)+1 with radical layering
    (a, n(a-1), (n^2-1)(a-1)) and socle layering ((n^2-1)(a-1), n(a-1)+1, a-1).

    A is a direct sum of a-1 copies of P (the (n^2-1) x n tuple of
    :func:`dimgt1_A` with m = n), C = [0 | Q + ... + Q] with Q the n x 1
    tuple of :func:`dimgt1_C`, and the first column of B is the first unit
    vector outside the column span of the stacked A-tuple.
    """
    if a < 2:
        raise ValueError("need a >= 2")
    alg = make_local_algebra(n, gram, field)
    f = alg.field
    P = dimgt1_A(n, n, f)
    Q = dimgt1_C(n, n, 1, f)
    k = a - 1
    d2, d1, d0 = (n * n - 1) * k, n * k, a
    A = [block_diag([P[i]] * k, f) for i in range(n)]
    C = [hstack([Matrix.zeros(f, d1, 1), block_diag([Q[i]] * k, f)]) for i in range(n)]
    stacked = Matrix._wrap(f, np.concatenate([m.array for m in A], axis=0))
    base = stacked.rank()
    col = None
    for r in range(n * d2):
        e = _unit(f, n * d2, 1, r, 0)
        if hstack([stacked, e]).rank() > base:
            col = e
            break
    assert col is not None
    B = []
    for i in range(n):
        b = f.zeros((d2, d0))
        b[:, 0] = col.array[i * d2 : (i + 1) * d2, 0]
        B.append(Matrix._wrap(f, b))
    return _from_standard(alg, A, B, C)


# -- arbitrary layerings ----------------------------------------------------------

def generator_tuple(n: int, pairs: Sequence[tuple[int, int]], f: FieldSpec, shift: int = 0) -> list[Matrix]:
    """Block-diagonal A-tuple assembled from the generator witnesses for
    ``pairs`` (from :func:`root_decompose`).  Summand k has its generator
    indices rotated by k + shift, which keeps sum x_i^2 invariant."""
    blocks: list[list[Matrix]] = [[] for _ in range(n)]
    for k, (d1, d2) in enumerate(pairs):
        if d1 == 1 and d2 <= n - 1:
            A, _ = dim1_tuples(n, d2, 1, f)
        else:
            A = dimgt1_A(n, d1, f)
        rot = (k + shift) % n
        for i in range(n):
            blocks[(i + rot) % n].append(A[i])
    return [block_diag(b, f) for b in blocks]


def witness_any(
    n: int,
    d: Sequence[int],
    field: FieldSpec = DEFAULT_FIELD,
    seed=0,
    *,
    gram=None,
    retries: int = 100,
    require_nonempty: bool = True,
) -> Representation:
    """A representation with radical layering exactly d.

    Even attempts use the generator A-tuple from the root decomposition of
    (d1, d2) with rotating index assignments; odd attempts use a uniformly
    random A-tuple.  C is drawn from the relation kernel, B uniformly, and
    the result is accepted only if its radical layering is d.  With
    ``require_nonempty=False`` the precondition is not checked, so the
    search itself can be used to probe empty strata.
    """
    alg = make_local_algebra(n, gram, field)
    f = alg.field
    d = tuple(int(x) for x in d)
    if require_nonempty:
        _require_nonempty(n, d)
    d0, d1, d2 = d
    if min(d) < 0:
        raise ValueError("layering entries must be nonnegative")
    if d1 == 0 and d2 == 0:
        return zero_rep(alg, d0)
    rng = np.random.default_rng(seed)
    try:
        pairs = root_decompose(n, d1, d2)
    except DecompositionError:
        pairs = None
    for attempt in range(retries):
        if pairs is not None and attempt % 2 == 0:
            A = generator_tuple(n, pairs, f, shift=attempt // 2)
            if not alg.is_standard:
                A = list(denormalize_tuple(alg, A))
        else:
            A = [random_entries(f, rng, d2, d1) for _ in range(n)]
        if hstack(A, f, d2).rank() != d2:
            continue
        C = relation_kernel_C(alg, A, d0, rng)
        if hstack(list(C), f, d1).rank() != d1:
            continue
        B = [random_entries(f, rng, d2, d0) for _ in range(n)]
        rep = assemble_local(alg, A, B, C)
        if raddim(rep, check=False).flat == d:
            return rep
    raise WitnessSearchError(f"no witness for layering {d} (n={n}) within {retries} attempts, seed {seed}")


def standard_relation_holds(alg: LocalAlgebra, A: Sequence[Matrix], C: Sequence[Matrix]) -> bool:
    """sum_ij a_ij A_i C_j == 0."""
    f = alg.field
    total = Matrix.zeros(f, A[0].nrows, C[0].ncols)
    for Ap, Cj in zip(normalize_tuple(alg, A), C):
        total = total + Ap @ Cj
    return total.is_zero()
