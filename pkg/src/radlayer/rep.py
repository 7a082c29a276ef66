"""Concrete representations: relation checks, radical and socle chains,
layering vectors, adapted flag bases, h-invariants, sums and duals."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from .algebra import (
    LocalAlgebra,
    Path,
    Presentation,
    PresentationError,
    presentation_from_json,
)
from .exactmat import DimensionError, FieldSpec, Matrix, block_diag, hstack, vstack


class InvalidRepresentationError(ValueError):
    """The matrices do not satisfy the relations of the presentation."""

    def __init__(self, message: str, witness: str | None = None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class LayeringVector:
    """Sequence of per-vertex dimension vectors, one per layer."""

    layers: tuple[tuple[int, ...], ...]
    vertices: tuple[str, ...] = ("v",)

    def __post_init__(self):
        for layer in self.layers:
            if len(layer) != len(self.vertices):
                raise DimensionError("layer length differs from the number of vertices")
            if any(x < 0 for x in layer):
                raise ValueError("layering entries must be nonnegative")

    @classmethod
    def of(cls, *counts: int, vertex: str = "v") -> "LayeringVector":
        """Single-vertex layering from its counts."""
        return cls(tuple((int(c),) for c in counts), (vertex,))

    @property
    def flat(self) -> tuple[int, ...]:
        if len(self.vertices) != 1:
            raise ValueError("flat view only exists for one-vertex layerings")
        return tuple(layer[0] for layer in self.layers)

    def total(self) -> dict[str, int]:
        return {v: sum(layer[k] for layer in self.layers) for k, v in enumerate(self.vertices)}

    def reversed(self) -> "LayeringVector":
        return LayeringVector(tuple(reversed(self.layers)), self.vertices)

    def __len__(self):
        return len(self.layers)

    def __str__(self):
        if len(self.vertices) == 1:
            return "(" + ",".join(str(x) for x in self.flat) + ")"
        return "[" + "; ".join(",".join(str(x) for x in layer) for layer in self.layers) + "]"

    def to_json(self):
        if len(self.vertices) == 1:
            return list(self.flat)
        return [list(layer) for layer in self.layers]


class Representation:
    """A representation of a presentation: vertex dimensions plus one matrix
    (target dim x source dim) per arrow.  Relations are checked on
    construction; use :meth:`unchecked` only for deliberately invalid data."""

    __slots__ = ("presentation", "dims", "arrows", "_paths")

    def __init__(
        self,
        presentation: Presentation,
        dims: Mapping[str, int],
        arrows: Mapping[str, Matrix],
        *,
        _check: bool = True,
    ):
        q = presentation.quiver
        self.presentation = presentation
        self.dims = {v: int(dims.get(v, 0)) for v in q.vertices}
        extra = set(dims) - set(q.vertices)
        if extra:
            raise PresentationError(f"unknown vertices {sorted(extra)}")
        field = presentation.field
        out = {}
        for a in q.arrows:
            m = arrows.get(a.id)
            shape = (self.dims[a.target], self.dims[a.source])
            if m is None:
                m = Matrix.zeros(field, *shape)
            if m.field != field:
                raise DimensionError(f"arrow {a.id} has entries in {m.field}, expected {field}")
            if m.shape != shape:
                raise DimensionError(f"arrow {a.id} has shape {m.shape}, expected {shape}")
            out[a.id] = m
        unknown = set(arrows) - set(out)
        if unknown:
            raise PresentationError(f"unknown arrows {sorted(unknown)}")
        self.arrows = out
        self._paths: dict[Path, Matrix] = {}
        if _check:
            res = check_relations(self)
            if not res:
                raise InvalidRepresentationError(
                    f"relation {res.witness} does not vanish", res.witness
                )

    @classmethod
    def unchecked(cls, presentation, dims, arrows) -> "Representation":
        return cls(presentation, dims, arrows, _check=False)

    @classmethod
    def local(cls, alg: LocalAlgebra, mats: Sequence[Matrix], *, check: bool = True) -> "Representation":
        if len(mats) != alg.n:
            raise DimensionError(f"expected {alg.n} matrices")
        d = mats[0].nrows
        return cls(alg, {alg.VERTEX: d}, dict(zip(alg.generators, mats)), _check=check)

    @property
    def field(self) -> FieldSpec:
        return self.presentation.field

    @property
    def quiver(self):
        return self.presentation.quiver

    @property
    def dim(self) -> int:
        return sum(self.dims.values())

    @property
    def matrices(self) -> tuple[Matrix, ...]:
        """Arrow matrices in quiver order."""
        return tuple(self.arrows[a.id] for a in self.quiver.arrows)

    def path_matrix(self, path: Path) -> Matrix:
        """phi(f1 ... fk) = phi(f1) @ ... @ phi(fk)."""
        m = self._paths.get(path)
        if m is None:
            if len(path) == 1:
                m = self.arrows[path[0]]
            else:
                self.quiver.path_ends(path)
                m = self.arrows[path[0]] @ self.path_matrix(path[1:])
            self._paths[path] = m
        return m

    def __eq__(self, other):
        if not isinstance(other, Representation):
            return NotImplemented
        return (
            self.presentation == other.presentation
            and self.dims == other.dims
            and self.arrows == other.arrows
        )

    def __repr__(self):
        return f"Representation(dims={self.dims}, arrows={ {k: v.tolist() for k, v in self.arrows.items()} })"

    # -- serialisation ----------------------------------------------------
    def to_json(self) -> dict:
        return {
            "presentation": self.presentation.to_json(),
            "dims": dict(self.dims),
            "arrows": {k: m.tolist() for k, m in self.arrows.items()},
        }

    @classmethod
    def from_json(cls, obj: dict, *, check: bool = True) -> "Representation":
        pres = presentation_from_json(obj["presentation"])
        dims = {str(k): int(v) for k, v in obj["dims"].items()}
        arrows = {}
        for a in pres.quiver.arrows:
            rows = obj["arrows"].get(a.id)
            shape = (dims.get(a.target, 0), dims.get(a.source, 0))
            if rows is None:
                continue
            arrows[a.id] = Matrix(pres.field, np.asarray(rows, dtype=object).reshape(shape))
        return cls(pres, dims, arrows, _check=check)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def loads(cls, text: str) -> "Representation":
        return cls.from_json(json.loads(text))


# -- evaluation and relations ---------------------------------------------------

def evaluate_element(rep: Representation, terms: Iterable[tuple[Any, Path]], vertex: str | None = None) -> Matrix:
    """Evaluate sum c * phi(path).  An empty path is the idempotent at
    ``vertex`` (or at the only vertex of a one-vertex quiver)."""
    terms = list(terms)
    q = rep.quiver
    ends = set()
    for _, path in terms:
        if path:
            ends.add(q.path_ends(tuple(path)))
        else:
            v = vertex if vertex is not None else (q.vertices[0] if len(q.vertices) == 1 else None)
            if v is None:
                raise PresentationError("empty path needs a vertex")
            ends.add((v, v))
    if len(ends) != 1:
        raise PresentationError("element is not homogeneous")
    s, e = ends.pop()
    out = Matrix.zeros(rep.field, rep.dims[e], rep.dims[s])
    for c, path in terms:
        m = rep.path_matrix(tuple(path)) if path else Matrix.identity(rep.field, rep.dims[s])
        out = out + m.scale(c)
    return out


@dataclass(frozen=True)
class RelationCheck:
    ok: bool
    witness: str | None = None

    def __bool__(self):
        return self.ok


def check_relations(rep: Representation) -> RelationCheck:
    """All relation generators and all paths of length m must vanish."""
    for r in rep.presentation.relations:
        if not evaluate_element(rep, r.as_element()).is_zero():
            return RelationCheck(False, r.label())
    for path in rep.quiver.paths_of_length(rep.presentation.m):
        if not rep.path_matrix(path).is_zero():
            return RelationCheck(False, "*".join(path))
    return RelationCheck(True)


def _require_valid(rep: Representation):
    res = check_relations(rep)
    if not res:
        raise InvalidRepresentationError(f"relation {res.witness} does not vanish", res.witness)


# -- radical and socle filtrations ---------------------------------------------

def radical_chain(rep: Representation) -> list[dict[str, Matrix]]:
    """Bases (as columns) of rad^0 V, rad^1 V, ..., rad^m V per vertex."""
    q = rep.quiver
    f = rep.field
    chain = [{v: Matrix.identity(f, rep.dims[v]) for v in q.vertices}]
    for _ in range(rep.presentation.m):
        prev = chain[-1]
        nxt = {}
        for v in q.vertices:
            parts = [rep.arrows[a.id] @ prev[a.source] for a in q.ending_at(v)]
            parts = [p for p in parts if p.ncols]
            nxt[v] = hstack(parts).colspace() if parts else Matrix.zeros(f, rep.dims[v], 0)
        chain.append(nxt)
    return chain


def socle_chain(rep: Representation) -> list[dict[str, Matrix]]:
    """Bases of soc^0 V = 0, soc^1 V, ..., soc^m V = V per vertex; soc^i is the
    common kernel of all paths of length i."""
    q = rep.quiver
    f = rep.field
    chain = [{v: Matrix.zeros(f, rep.dims[v], 0) for v in q.vertices}]
    for i in range(1, rep.presentation.m + 1):
        paths = q.paths_of_length(i)
        level = {}
        for v in q.vertices:
            mats = [rep.path_matrix(p) for p in paths if q.arrow(p[-1]).source == v]
            mats = [m for m in mats if m.nrows]
            if mats:
                level[v] = vstack(mats).kernel()
            else:
                level[v] = Matrix.identity(f, rep.dims[v])
        chain.append(level)
    return chain


def _dims_to_layering(rep: Representation, dims: list[dict[str, int]]) -> LayeringVector:
    vs = rep.quiver.vertices
    return LayeringVector(tuple(tuple(layer[v] for v in vs) for layer in dims), vs)


def raddim(rep: Representation, *, check: bool = True) -> LayeringVector:
    """Dimensions of rad^i V / rad^{i+1} V, i = 0..m-1."""
    if check:
        _require_valid(rep)
    chain = radical_chain(rep)
    m = rep.presentation.m
    return _dims_to_layering(
        rep, [{v: chain[i][v].ncols - chain[i + 1][v].ncols for v in rep.dims} for i in range(m)]
    )


def socdim(rep: Representation, *, check: bool = True) -> LayeringVector:
    """Dimensions of soc^{i+1} V / soc^i V, i = 0..m-1 (socle first)."""
    if check:
        _require_valid(rep)
    chain = socle_chain(rep)
    m = rep.presentation.m
    return _dims_to_layering(
        rep, [{v: chain[i + 1][v].ncols - chain[i][v].ncols for v in rep.dims} for i in range(m)]
    )


# -- adapted bases --------------------------------------------------------------

def _extend_along(chain: list[Matrix], field: FieldSpec, d: int) -> Matrix:
    """Basis of k^d whose first vectors span chain[0], then chain[1], ...
    (an increasing chain).  Greedy and deterministic: the earliest candidate
    independent of what is already chosen is kept."""
    basis = Matrix.zeros(field, d, 0)
    for sub in chain:
        if sub.ncols == 0:
            continue
        aug = hstack([basis, sub])
        piv = aug.rref()[1]
        keep = [c - basis.ncols for c in piv if c >= basis.ncols]
        if keep:
            basis = hstack([basis] + [sub.block(0, d, c, c + 1) for c in keep])
    return basis


@dataclass(frozen=True)
class AdaptedRep:
    """A representation rewritten in a basis adapted to its radical (or socle)
    flag.  ``block_sizes[v]`` lists the diagonal block sizes in matrix order;
    block 0 is the deepest radical layer (radical flag) or the socle (socle flag)."""

    base: Representation
    flag: dict[str, Matrix]
    adapted: Representation
    layering: LayeringVector
    kind: str
    block_sizes: dict[str, tuple[int, ...]]

    def block(self, arrow: str, i: int, j: int) -> Matrix:
        a = self.base.quiver.arrow(arrow)
        rs = self.block_sizes[a.target]
        cs = self.block_sizes[a.source]
        r0, c0 = sum(rs[:i]), sum(cs[:j])
        return self.adapted.arrows[arrow].block(r0, r0 + rs[i], c0, c0 + cs[j])

    def _named(self, i, j) -> tuple[Matrix, ...]:
        if self.base.presentation.m != 3 or len(self.base.quiver.vertices) != 1:
            raise ValueError("named blocks A, B, C need a one-vertex presentation with m = 3")
        return tuple(self.block(a.id, i, j) for a in self.base.quiver.arrows)

    @property
    def A(self) -> tuple[Matrix, ...]:
        return self._named(0, 1)

    @property
    def B(self) -> tuple[Matrix, ...]:
        return self._named(0, 2)

    @property
    def C(self) -> tuple[Matrix, ...]:
        return self._named(1, 2)

    def is_block_triangular(self) -> bool:
        """Every arrow maps block j into blocks i < j only."""
        for a in self.base.quiver.arrows:
            nb = len(self.block_sizes[a.source])
            for i in range(nb):
                for j in range(i + 1):
                    if not self.block(a.id, i, j).is_zero():
                        return False
        return True

    def rank_conditions_hold(self) -> bool:
        """For a radical flag: each block above the diagonal, summed over the
        arrows ending at a vertex, has full row rank."""
        q = self.base.quiver
        for v in q.vertices:
            sizes = self.block_sizes[v]
            for k in range(len(sizes) - 1):
                if sizes[k] == 0:
                    continue
                parts = [self.block(a.id, k, k + 1) for a in q.ending_at(v)]
                parts = [p for p in parts if p.ncols]
                r = hstack(parts).rank() if parts else 0
                if r != sizes[k]:
                    return False
        return True


def adapt_basis(rep: Representation, kind: str = "radical") -> AdaptedRep:
    """Change basis so that rad^i V(a) (``kind="radical"``) or soc^i V(a)
    (``kind="socle"``) is spanned by the leading basis vectors."""
    _require_valid(rep)
    m = rep.presentation.m
    f = rep.field
    vs = rep.quiver.vertices
    if kind == "radical":
        chain = radical_chain(rep)
        ordered = [{v: chain[i][v] for v in vs} for i in range(m - 1, -1, -1)]
        lay = raddim(rep, check=False)
        sizes = {v: tuple(lay.layers[i][k] for i in range(m - 1, -1, -1)) for k, v in enumerate(vs)}
    elif kind == "socle":
        chain = socle_chain(rep)
        ordered = [{v: chain[i][v] for v in vs} for i in range(1, m + 1)]
        lay = socdim(rep, check=False)
        sizes = {v: tuple(lay.layers[i][k] for i in range(m)) for k, v in enumerate(vs)}
    else:
        raise ValueError("kind must be 'radical' or 'socle'")
    flag = {v: _extend_along([lvl[v] for lvl in ordered], f, rep.dims[v]) for v in vs}
    adapted = conjugate(rep, {v: flag[v].inverse() for v in vs}, check=False)
    return AdaptedRep(rep, flag, adapted, lay, kind, sizes)


def conjugate(rep: Representation, g: Mapping[str, Matrix], *, check: bool = True) -> Representation:
    """Base change phi(f) -> g[e(f)] @ phi(f) @ g[s(f)]^{-1}."""
    ginv = {v: m.inverse() for v, m in g.items()}
    arrows = {a.id: g[a.target] @ rep.arrows[a.id] @ ginv[a.source] for a in rep.quiver.arrows}
    return Representation(rep.presentation, rep.dims, arrows, _check=check)


@dataclass(frozen=True)
class HInvariants:
    h0: int
    h1: int
    h0_dual: int
    h1_dual: int


def h_invariants(arep: AdaptedRep) -> HInvariants:
    """h0 = dim of the common kernel of the C_i, h1 = same for the A_i, both in
    the radical-adapted form; the dual pair measures common cokernels of the
    A- and C-blocks in the socle-adapted form (equivalently h0, h1 of the
    transpose)."""
    rad = arep if arep.kind == "radical" else adapt_basis(arep.base, "radical")
    soc = arep if arep.kind == "socle" else adapt_basis(arep.base, "socle")
    f = rad.base.field
    _, d1, d0 = rad.block_sizes[rad.base.quiver.vertices[0]]
    h0 = d0 - vstack(rad.C, f, d0).rank()
    h1 = d1 - vstack(rad.A, f, d1).rank()
    s0, s1, _ = soc.block_sizes[soc.base.quiver.vertices[0]]
    h0d = s0 - hstack(soc.A, f, s0).rank()
    h1d = s1 - hstack(soc.C, f, s1).rank()
    return HInvariants(h0, h1, h0d, h1d)


# -- constructions on representations ------------------------------------------

def direct_sum(r1: Representation, r2: Representation) -> Representation:
    if r1.presentation != r2.presentation:
        raise PresentationError("direct sum of representations of different presentations")
    f = r1.field
    dims = {v: r1.dims[v] + r2.dims[v] for v in r1.dims}
    arrows = {k: block_diag([r1.arrows[k], r2.arrows[k]], f) for k in r1.arrows}
    return Representation(r1.presentation, dims, arrows, _check=False)


def transpose_dual(rep: Representation) -> Representation:
    """The dual module realised by transposing every arrow.  For the local
    algebra the Gram matrix of S transposes as well."""
    pres = rep.presentation
    if len(pres.quiver.vertices) != 1:
        raise PresentationError("transpose duality is only implemented for one-vertex presentations")
    if isinstance(pres, LocalAlgebra):
        dual_pres = LocalAlgebra(pres.n, pres.gram.T, pres.field)
    else:
        from .algebra import QuiverPresentation, RelationGenerator, RelationTerm

        rels = []
        for r in pres.relations:
            terms = []
            for t in r.terms:
                rev = tuple(reversed(t.path))
                terms.append(RelationTerm(t.coeff, rev[:-1], rev[-1]))
            rels.append(RelationGenerator(tuple(terms), r.name))
        dual_pres = QuiverPresentation(pres.quiver, tuple(rels), pres.m, pres.field)
    arrows = {k: m.T for k, m in rep.arrows.items()}
    return Representation(dual_pres, rep.dims, arrows)


def zero_rep(pres: Presentation, dims: Mapping[str, int] | int) -> Representation:
    if isinstance(dims, int):
        dims = {pres.quiver.vertices[0]: dims}
    return Representation(pres, dims, {}, _check=False)


def relation_matrix(rep: Representation, vertex: str) -> tuple[Matrix, list[str]]:
    """The matrix B(a) at ``vertex``: one block row per relation starting
    there, one block column per arrow x starting there; block (r, x) is the
    sum of c * phi(g) over the terms c*g*x of r.  Returns (B, arrow ids)."""
    q = rep.quiver
    f = rep.field
    cols = q.starting_at(vertex)
    rows = []
    for r in rep.presentation.relations:
        start, end = r.ends(q)
        if start != vertex:
            continue
        blocks = {a.id: Matrix.zeros(f, rep.dims[end], rep.dims[a.target]) for a in cols}
        for t in r.terms:
            blocks[t.x] = blocks[t.x] + rep.path_matrix(tuple(t.g)).scale(t.coeff)
        rows.append(hstack([blocks[a.id] for a in cols], f, rep.dims[end]))
    width = sum(rep.dims[a.target] for a in cols)
    return vstack(rows, f, width), [a.id for a in cols]
