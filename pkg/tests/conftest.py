from fractions import Fraction

import numpy as np
import pytest

from radlayer.exactmat import DEFAULT_FIELD, FieldSpec, Matrix


def oracle_rank(rows, p=None):
    """Plain-Python Gaussian elimination, independent of the library."""
    m = [[Fraction(x) if p is None else int(x) % p for x in r] for r in rows]
    rank, ncols = 0, len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][c] if p is None else pow(m[rank][c], -1, p)
        for r in range(len(m)):
            if r != rank and m[r][c] != 0:
                f = m[r][c] * inv
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
                if p is not None:
                    m[r] = [a % p for a in m[r]]
        rank += 1
    return rank


def mat(rows, field=DEFAULT_FIELD):
    return Matrix(field, rows)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=[FieldSpec(3), FieldSpec(32003), FieldSpec(None)], ids=["F3", "F32003", "Q"])
def any_field(request):
    return request.param
