"""Fibre dimensions of the relation map over truncated representations.

For a layering (d0, d1, ..., d_{m-1}) a representation is its deeper part M'
(layering (d1, ..., d_{m-1})) plus one block N_x per arrow x, mapping the top
layer at s(x) into M'(e(x)).  The relations cut out the linear space
{N : B(a) N(a) = 0 for every vertex a}, whose dimension is
sum_a (n(a) - rank B(a)) * d0(a).
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .algebra import Presentation
from .exactmat import Matrix, kron, vstack
from .rep import LayeringVector, Representation, relation_matrix
from .sampler import SamplingError, _layers_as_dicts, sample_layered

log = logging.getLogger(__name__)


def _d0_map(pres: Presentation, d0) -> dict[str, int]:
    vs = pres.quiver.vertices
    if isinstance(d0, Mapping):
        return {v: int(d0.get(v, 0)) for v in vs}
    if len(vs) != 1:
        raise ValueError("d0 must be a per-vertex mapping for multi-vertex quivers")
    return {vs[0]: int(d0)}


def _require_decomposed(pres: Presentation):
    for r in pres.relations:
        if not r.terms:
            raise ValueError(f"relation {r.label()} has no decomposed terms")


def fiber_dim(Mprime: Representation, d0, pres: Presentation | None = None) -> int:
    """sum_a (n(a) - rank B(a)) * d0(a), with n(a) the total dimension of the
    targets of the arrows starting at a."""
    pres = pres or Mprime.presentation
    if pres != Mprime.presentation:
        raise ValueError("Mprime is a representation of a different presentation")
    _require_decomposed(pres)
    top = _d0_map(pres, d0)
    total = 0
    for a in pres.quiver.vertices:
        B, _ = relation_matrix(Mprime, a)
        total += (B.ncols - B.rank()) * top[a]
    return total


def fiber_dim_bruteforce(Mprime: Representation, d0, pres: Presentation | None = None) -> int:
    """Kernel dimension of the whole linear system in all entries of all N_x
    at once (vec(G N) = (I kron G) vec(N)), without splitting by vertex."""
    pres = pres or Mprime.presentation
    _require_decomposed(pres)
    top = _d0_map(pres, d0)
    q = pres.quiver
    f = pres.field
    offsets, width = {}, 0
    for x in q.arrows:
        offsets[x.id] = width
        width += Mprime.dims[x.target] * top[x.source]
    rows = []
    for r in pres.relations:
        s, e = r.ends(q)
        h = Mprime.dims[e] * top[s]
        row = f.zeros((h, width))
        for t in r.terms:
            G = Mprime.path_matrix(tuple(t.g)).scale(t.coeff)
            blk = kron(Matrix.identity(f, top[s]), G)
            o = offsets[t.x]
            row[:, o : o + blk.ncols] = f.reduce(row[:, o : o + blk.ncols] + blk.array)
        rows.append(Matrix._wrap(f, row))
    system = vstack(rows, f, width)
    return width - system.rank()


@dataclass
class FiberReport:
    layering: LayeringVector
    samples: int
    seed: int
    fiber_dims: Counter
    witness_pair: tuple[tuple[int, int], tuple[int, int]] | None = None
    oracle_mismatches: list[int] = field(default_factory=list)

    @property
    def constant(self) -> bool:
        return len(self.fiber_dims) == 1

    def to_json(self) -> dict:
        return {
            "layering": self.layering.to_json(),
            "samples": self.samples,
            "seed": self.seed,
            "fiberDims": [{"dim": k, "count": c} for k, c in sorted(self.fiber_dims.items())],
            "constant": self.constant,
            "witnessPair": (
                [{"sample": i, "dim": dd} for i, dd in self.witness_pair] if self.witness_pair else None
            ),
            "oracleMismatches": list(self.oracle_mismatches),
        }

    def table(self) -> str:
        lines = [f"layering {self.layering}, {self.samples} samples, seed {self.seed}"]
        lines.append(f"{'fibre dim':>10}  {'count':>6}")
        for k, c in sorted(self.fiber_dims.items()):
            lines.append(f"{k:>10}  {c:>6}")
        verdict = "constant" if self.constant else "NOT constant"
        lines.append(f"verdict: {verdict}")
        if self.witness_pair:
            (i, a), (j, b) = self.witness_pair
            lines.append(f"witness: sample {i} has fibre dim {a}, sample {j} has fibre dim {b}")
        if self.oracle_mismatches:
            lines.append(f"oracle mismatches at samples {self.oracle_mismatches}")
        return "\n".join(lines)


def sample_point(pres: Presentation, layering, seed: int, index: int, zero_prob: float) -> Representation:
    """The deeper part M' used by sample ``index`` of a probe; reproducible
    from (seed, index)."""
    layers = _layers_as_dicts(pres, layering)
    rng = np.random.default_rng(np.random.SeedSequence(seed).spawn(index + 1)[index])
    return sample_layered(pres, layers[1:] or [{v: 0 for v in pres.quiver.vertices}], rng, zero_prob=zero_prob)


def fiber_constancy_probe(
    pres: Presentation,
    layering,
    samples: int = 100,
    seed: int = 0,
    *,
    zero_prob: float = 0.5,
    check_oracle: bool = True,
) -> FiberReport:
    """Sample points M' with the truncated layering, compute the fibre
    dimension over each, and report whether it is constant.

    ``zero_prob`` biases the samples towards sparse (degenerate) points, where
    fibre dimensions jump if they jump at all; a uniform sample over a large
    field almost never leaves the generic locus.  A non-constant verdict
    always comes with an explicit pair of sample indices.
    """
    layers = _layers_as_dicts(pres, layering)
    vs = pres.quiver.vertices
    lv = layering if isinstance(layering, LayeringVector) else LayeringVector(
        tuple(tuple(layer[v] for v in vs) for layer in layers), vs
    )
    d0 = layers[0]
    sub = layers[1:] or [{v: 0 for v in vs}]
    dims: Counter = Counter()
    first: dict[int, int] = {}
    mismatches = []
    for i, child in enumerate(np.random.SeedSequence(seed).spawn(samples)):
        try:
            Mp = sample_layered(pres, sub, np.random.default_rng(child), zero_prob=zero_prob)
        except SamplingError as exc:
            raise SamplingError(f"probe sample {i} (seed {seed}): {exc}") from exc
        fd = fiber_dim(Mp, d0, pres)
        if check_oracle and fd != fiber_dim_bruteforce(Mp, d0, pres):
            mismatches.append(i)
        dims[fd] += 1
        first.setdefault(fd, i)
    pair = None
    if len(first) > 1:
        (a, i), (b, j) = sorted(first.items())[:2]
        pair = ((i, a), (j, b))
    return FiberReport(lv, samples, seed, dims, pair, mismatches)
