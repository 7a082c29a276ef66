"""Random and exhaustive oracles for layered representations.

Sampled representations are returned in adapted form: the basis is ordered
deepest radical layer first, so every arrow matrix is strictly block upper
triangular.
"""

from __future__ import annotations

import itertools
import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .algebra import LocalAlgebra, Presentation, make_local_algebra, normalize_tuple
from .exactmat import DEFAULT_FIELD, FieldSpec, Matrix, block_compose, hstack, vstack
from .layering import DimVec3, _require_nonempty, dominance_leq, dominance_minima, rad_nonempty, triples
from .rep import LayeringVector, Representation, raddim, relation_matrix, socdim, zero_rep

log = logging.getLogger(__name__)


class SamplingError(RuntimeError):
    """The retry budget ran out before a sample with the requested layering was found."""


class BudgetExceeded(RuntimeError):
    """An exhaustive search would exceed its budget."""

    def __init__(self, size: int, budget: int):
        super().__init__(f"search space has {size} candidates, budget is {budget}")
        self.size = size
        self.budget = budget


# -- building blocks ------------------------------------------------------------

def random_entries(field: FieldSpec, rng: np.random.Generator, rows: int, cols: int, zero_prob: float = 0.0) -> Matrix:
    """Uniform matrix; with ``zero_prob`` > 0 each entry is forced to zero
    with that probability (used to reach degenerate points on purpose)."""
    a = field.random(rng, (rows, cols))
    if zero_prob > 0 and a.size:
        a = a.copy()
        a[rng.random((rows, cols)) < zero_prob] = field.scalar(0)
    return Matrix._wrap(field, a)


def sample_kernel_columns(K: Matrix, ncols: int, rng: np.random.Generator, zero_prob: float = 0.0) -> Matrix:
    """``ncols`` random vectors of ker K, as the columns of a matrix."""
    Z = K.kernel()
    coeffs = random_entries(K.field, rng, Z.ncols, ncols, zero_prob)
    return Z @ coeffs


def assemble_local(
    alg: LocalAlgebra,
    A: Sequence[Matrix],
    B: Sequence[Matrix],
    C: Sequence[Matrix],
    *,
    check: bool = True,
) -> Representation:
    """x_i = [[0, A_i, B_i], [0, 0, C_i], [0, 0, 0]] with blocks d2, d1, d0."""
    f = alg.field
    d2, d1 = A[0].shape
    d0 = C[0].ncols
    Z = Matrix.zeros
    mats = [
        block_compose(
            [
                [Z(f, d2, d2), A[i], B[i]],
                [Z(f, d1, d2), Z(f, d1, d1), C[i]],
                [Z(f, d0, d2), Z(f, d0, d1), Z(f, d0, d0)],
            ]
        )
        for i in range(alg.n)
    ]
    return Representation.local(alg, mats, check=check)


def split_rows(m: Matrix, sizes: Sequence[int]) -> list[Matrix]:
    out, r = [], 0
    for s in sizes:
        out.append(m.block(r, r + s, 0, m.ncols))
        r += s
    return out


def relation_kernel_C(alg: LocalAlgebra, A: Sequence[Matrix], d0: int, rng, zero_prob: float = 0.0) -> tuple[Matrix, ...]:
    """C-tuple (d1 x d0 each) whose columns are drawn from the solution space
    of sum_ij a_ij A_i C_j = 0."""
    f = alg.field
    d2, d1 = A[0].shape
    K = hstack(list(normalize_tuple(alg, A)), f, d2)
    cols = sample_kernel_columns(K, d0, rng, zero_prob)
    return tuple(split_rows(cols, [d1] * alg.n))


def adapted_blocks(rep: Representation, d: Sequence[int]):
    """(A, B, C) blocks of a one-vertex rep that is already in adapted form."""
    d0, d1, d2 = d
    cuts = [0, d2, d2 + d1, d2 + d1 + d0]
    A = tuple(m.block(cuts[0], cuts[1], cuts[1], cuts[2]) for m in rep.matrices)
    B = tuple(m.block(cuts[0], cuts[1], cuts[2], cuts[3]) for m in rep.matrices)
    C = tuple(m.block(cuts[1], cuts[2], cuts[2], cuts[3]) for m in rep.matrices)
    return A, B, C


def adapted_h_values(rep: Representation, d: Sequence[int]) -> tuple[int, int]:
    """(h0, h1) read off the blocks of an adapted one-vertex rep."""
    A, _, C = adapted_blocks(rep, d)
    f = rep.field
    d0, d1, _ = d
    return d0 - vstack(list(C), f, d0).rank(), d1 - vstack(list(A), f, d1).rank()


# -- general quivers ------------------------------------------------------------

def _layers_as_dicts(pres: Presentation, layering) -> list[dict[str, int]]:
    vs = pres.quiver.vertices
    if isinstance(layering, LayeringVector):
        if tuple(layering.vertices) != tuple(vs):
            raise ValueError(f"layering vertices {layering.vertices} differ from {vs}")
        layers = [dict(zip(vs, layer)) for layer in layering.layers]
    else:
        layers = []
        for layer in layering:
            if isinstance(layer, Mapping):
                layers.append({v: int(layer.get(v, 0)) for v in vs})
            elif len(vs) == 1 and not isinstance(layer, (tuple, list)):
                layers.append({vs[0]: int(layer)})
            else:
                layers.append(dict(zip(vs, (int(x) for x in layer))))
    if len(layers) > pres.m:
        raise ValueError(f"layering has {len(layers)} layers but the radical length is at most {pres.m}")
    while len(layers) > 1 and not any(layers[-1].values()):
        layers.pop()
    return layers


def sample_layered(
    pres: Presentation,
    layering,
    rng: np.random.Generator,
    *,
    zero_prob: float = 0.0,
    budget: int = 100,
) -> Representation:
    """Sample a representation with the given radical layering (top first),
    one layer at a time: the deeper part M' is sampled first, then the new
    top columns N are drawn from the kernel of B(a) at M' and kept when the
    block just above the diagonal has full row rank."""
    layers = _layers_as_dicts(pres, layering)
    return _sample_layers(pres, layers, rng, zero_prob, budget)


def _sample_layers(pres, layers, rng, zero_prob, budget) -> Representation:
    if len(layers) == 1:
        return zero_rep(pres, layers[0])
    q = pres.quiver
    f = pres.field
    top, below = layers[0], layers[1]
    for _ in range(budget):
        sub = _sample_layers(pres, layers[1:], rng, zero_prob, budget)
        N = {a.id: Matrix.zeros(f, sub.dims[a.target], top[a.source]) for a in q.arrows}
        for v in q.vertices:
            if top[v] == 0:
                continue
            Bv, ids = relation_matrix(sub, v)
            cols = sample_kernel_columns(Bv, top[v], rng, zero_prob)
            for aid, blk in zip(ids, split_rows(cols, [sub.dims[q.arrow(x).target] for x in ids])):
                N[aid] = blk
        ok = True
        for w in q.vertices:
            rows = (sub.dims[w] - below[w], sub.dims[w])
            parts = [N[a.id].block(*rows, 0, N[a.id].ncols) for a in q.ending_at(w)]
            if hstack(parts, f, below[w]).rank() != below[w]:
                ok = False
                break
        if not ok:
            continue
        dims = {v: sub.dims[v] + top[v] for v in q.vertices}
        arrows = {}
        for a in q.arrows:
            s, t = a.source, a.target
            arrows[a.id] = block_compose(
                [
                    [sub.arrows[a.id], N[a.id]],
                    [Matrix.zeros(f, top[t], sub.dims[s]), Matrix.zeros(f, top[t], top[s])],
                ]
            )
        return Representation(pres, dims, arrows)
    raise SamplingError(f"no sample with layering {layers} within {budget} attempts")


# -- the local algebra -----------------------------------------------------------

def sample_with_radlayering(
    n: int,
    d: Sequence[int],
    field: FieldSpec = DEFAULT_FIELD,
    seed=0,
    retry_budget: int = 100,
    *,
    gram=None,
    alg: LocalAlgebra | None = None,
    zero_prob: float = 0.0,
) -> Representation:
    """Random representation in adapted form with radical layering exactly d:
    A uniform until it has full row rank, C from the relation kernel until
    it has full row rank, B uniform."""
    alg = alg or make_local_algebra(n, gram, field)
    f = alg.field
    _require_nonempty(alg.n, d)
    d0, d1, d2 = (int(x) for x in d)
    rng = np.random.default_rng(seed)
    for _ in range(retry_budget):
        A = tuple(random_entries(f, rng, d2, d1, zero_prob) for _ in range(alg.n))
        if hstack(list(A), f, d2).rank() != d2:
            continue
        C = relation_kernel_C(alg, A, d0, rng, zero_prob)
        if hstack(list(C), f, d1).rank() != d1:
            continue
        B = tuple(random_entries(f, rng, d2, d0, zero_prob) for _ in range(alg.n))
        rep = assemble_local(alg, A, B, C)
        got = raddim(rep, check=False).flat
        if got == (d0, d1, d2):
            return rep
        log.warning("rank conditions passed but raddim is %s, expected %s", got, tuple(d))
    raise SamplingError(f"no sample with radical layering {tuple(d)} in {retry_budget} attempts (seed {seed})")


@dataclass
class GenericEstimate:
    n: int
    layering: DimVec3
    samples: int
    seed: int
    socdim_min: DimVec3 | None
    minima: list[DimVec3]
    h0_min: int
    h1_min: int
    histogram: Counter
    h_histogram: Counter

    def attained(self, value: Sequence[int]) -> Fraction:
        """Fraction of samples whose socle layering equals ``value``."""
        return Fraction(self.histogram.get(tuple(value), 0), self.samples)

    def to_json(self) -> dict:
        return {
            "layering": list(self.layering),
            "socdimMin": list(self.socdim_min) if self.socdim_min is not None else None,
            "minima": [list(x) for x in self.minima],
            "h0Min": self.h0_min,
            "h1Min": self.h1_min,
            "histogram": [{"socdim": list(k), "count": c} for k, c in sorted(self.histogram.items())],
            "seed": self.seed,
            "samples": self.samples,
        }


def estimate_generic(
    n: int,
    d: Sequence[int],
    samples: int = 200,
    field: FieldSpec = DEFAULT_FIELD,
    seed: int = 0,
    *,
    gram=None,
) -> GenericEstimate:
    """Dominance-minimum of socdim and minima of h0, h1 over ``samples``
    independent draws.  Incomparable minima trigger one round with twice as
    many samples; if still ambiguous ``socdim_min`` is None."""
    alg = make_local_algebra(n, gram, field)
    d = tuple(int(x) for x in d)
    _require_nonempty(n, d)
    hist: Counter = Counter()
    hhist: Counter = Counter()
    drawn = 0
    seeds = np.random.SeedSequence(seed)
    target = samples
    while True:
        for child in seeds.spawn(target - drawn):
            rep = sample_with_radlayering(n, d, seed=child, alg=alg)
            hist[socdim(rep, check=False).flat] += 1
            hhist[adapted_h_values(rep, d)] += 1
        drawn = target
        minima = dominance_minima(sorted(hist))
        if len(minima) == 1 or target > samples:
            break
        log.warning("incomparable socle layerings %s for %s; doubling the sample", minima, d)
        target = 2 * samples
    return GenericEstimate(
        n=n,
        layering=d,
        samples=drawn,
        seed=seed,
        socdim_min=minima[0] if len(minima) == 1 else None,
        minima=minima,
        h0_min=min(h[0] for h in hhist),
        h1_min=min(h[1] for h in hhist),
        histogram=hist,
        h_histogram=hhist,
    )


# -- exhaustive enumeration -----------------------------------------------------

def _shape_size(n: int, d: Sequence[int], p: int) -> int:
    d0, d1, d2 = d
    return p ** (n * (d2 * d1 + d2 * d0 + d1 * d0))


def search_space_size(n: int, dtotal: int, p: int) -> int:
    return sum(_shape_size(n, t, p) for t in triples(dtotal))


def brute_force_layerings(n: int, dtotal: int, p: int = 3, budget: int = 10**6, *, gram=None) -> set[DimVec3]:
    """Every radical layering realised by some strictly block upper
    triangular n-tuple over F_p, by exhaustive enumeration."""
    size = search_space_size(n, dtotal, p)
    if size > budget:
        raise BudgetExceeded(size, budget)
    alg = make_local_algebra(n, gram, FieldSpec(p))
    f = alg.field
    found: set[DimVec3] = set()
    for d in triples(dtotal):
        d0, d1, d2 = d
        shapes = [(d2, d1), (d2, d0), (d1, d0)]
        per = [r * c for r, c in shapes]
        width = sum(per)
        for entries in itertools.product(range(p), repeat=n * width):
            arr = np.array(entries, dtype=np.int64).reshape(n, width) if width else np.zeros((n, 0), np.int64)
            blocks = []
            for i in range(n):
                row, k = [], 0
                for (r, c), sz in zip(shapes, per):
                    row.append(Matrix(f, arr[i, k : k + sz].reshape(r, c)))
                    k += sz
                blocks.append(row)
            A = [b[0] for b in blocks]
            C = [b[2] for b in blocks]
            if hstack(A, f, d2).rank() != d2 or hstack(C, f, d1).rank() != d1:
                continue
            K = hstack(list(normalize_tuple(alg, A)), f, d2)
            if not (K @ vstack(C, f, d0)).is_zero():
                continue
            rep = assemble_local(alg, A, [b[1] for b in blocks], C)
            if raddim(rep).flat != d:
                raise AssertionError(f"rank conditions and raddim disagree at {d}")
            found.add(d)
            break
    return found


def predicted_layerings(n: int, dtotal: int) -> set[DimVec3]:
    return {t for t in triples(dtotal) if rad_nonempty(n, t)}


def socdim_complement_holds(rad: Sequence[int], soc: Sequence[int]) -> bool:
    """reverse(raddim) is dominated by socdim."""
    return dominance_leq(tuple(reversed(tuple(rad))), tuple(soc))
